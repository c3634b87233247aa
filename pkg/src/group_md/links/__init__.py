"""Group logarithm / exponential link functions"""
from group_md.links.base import LinkFunction, eval_dlink, eval_exp, eval_log
from group_md.links.factory import LinkFactory, compose_chain, get_link
from group_md.links.validation import ValidityReport, validate_params

__all__ = [
    'LinkFunction',
    'LinkFactory',
    'ValidityReport',
    'compose_chain',
    'eval_dlink',
    'eval_exp',
    'eval_log',
    'get_link',
    'validate_params',
]
