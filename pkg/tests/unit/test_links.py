"""
Unit tests for link functions
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from group_md.exceptions import DomainError, ParamError, ParseError, UnsupportedFamily
from group_md.links.base import eval_dlink, eval_exp, eval_log
from group_md.links.chain import ChainLink
from group_md.links.factory import LinkFactory, compose_chain, get_link
from group_md.links.natural import NaturalLink
from group_md.links.tsallis import TsallisLink
from group_md.links.validation import validate_params
from group_md.models.link_family import LinkFamily, LinkRole

ROUNDTRIP_GRID = np.geomspace(1e-6, 1.0, 64)

ALL_FAMILIES = [
    'natural',
    'tsallis:q=0.25',
    'tsallis:q=1.5',
    'kaniadakis1:kappa=0.5',
    'kaniadakis3:kappa=0.5,r=0.1,lam=1.0',
    'euler:a=0.5,b=-0.5',
    'stretched_exp:alpha=0.5,gamma=2.0',
    'super_exp:alpha=0.5,gamma=1.0',
    'chain:[tsallis:q=0.5>log|kaniadakis1:kappa=0.5>exp]',
]


class TestLinkFactory:
    """Test LinkFactory"""

    def test_create_tsallis_link(self):
        """Test creating a Tsallis link from a descriptor"""
        link = LinkFactory.create_link("tsallis:q=0.25")
        assert isinstance(link, TsallisLink)
        assert link.q == 0.25

    def test_create_from_family(self):
        """Test creating a link from a LinkFamily"""
        link = LinkFactory.create_link(LinkFamily.of("natural"))
        assert isinstance(link, NaturalLink)

    def test_create_chain_link(self):
        """Test chains build their constituents"""
        link = LinkFactory.create_link("chain:[tsallis:q=0.5>log|kaniadakis1:kappa=0.5>exp]")
        assert isinstance(link, ChainLink)
        assert [role for _, role in link.steps] == [LinkRole.LOG, LinkRole.EXP]

    def test_unregistered_family(self):
        """Test unregistered family raises error"""
        with pytest.raises(UnsupportedFamily, match="Unsupported link family"):
            LinkFactory.create_link(LinkFamily("mystery"))

    def test_malformed_descriptor(self):
        """Test malformed descriptors raise ParseError"""
        with pytest.raises(ParseError):
            LinkFactory.create_link("tsallis:q=abc")
        with pytest.raises(ParseError):
            LinkFactory.create_link("renyi:q=0.5")
        with pytest.raises(ParseError):
            LinkFactory.create_link("tsallis")

    def test_get_supported_families(self):
        """Test every family is registered"""
        families = LinkFactory.get_supported_families()
        for family in ('natural', 'tsallis', 'kaniadakis1', 'kaniadakis3', 'euler',
                       'stretched_exp', 'super_exp', 'chain'):
            assert family in families

    def test_register_link(self):
        """Test registering an extra family"""
        class ShiftedNatural(NaturalLink):
            family_id = "natural"

        LinkFactory.register_link("natural2", ShiftedNatural)
        try:
            link = LinkFactory.create_link(LinkFamily("natural2"))
            assert isinstance(link, ShiftedNatural)
        finally:
            LinkFactory._links.pop("natural2")

    def test_get_link_is_cached(self):
        """Test shared instances per descriptor"""
        assert get_link("tsallis:q=0.25") is get_link("tsallis:q=0.25")

    def test_descriptor_roundtrip(self):
        """Test descriptors print back as parsed"""
        for text in ("tsallis:q=0.25", "kaniadakis1:kappa=0.5",
                     "chain:[tsallis:q=0.5>log|kaniadakis1:kappa=0.5>exp]"):
            assert LinkFamily.from_descriptor(text).descriptor == text


class TestParameterInvariants:
    """Test family parameter validation"""

    @pytest.mark.parametrize("descriptor", [
        "tsallis:q=1.0",
        "tsallis:q=0",
        "tsallis:q=-0.5",
        "kaniadakis1:kappa=0",
        "kaniadakis1:kappa=1.5",
        "kaniadakis3:kappa=0.5,r=0.6,lam=1.0",
        "kaniadakis3:kappa=0.5,r=0.1,lam=0",
        "euler:a=0.5,b=0.5",
        "stretched_exp:alpha=1.0,gamma=2.0",
        "stretched_exp:alpha=0.5,gamma=0",
        "super_exp:alpha=1.0,gamma=1.0",
        "super_exp:alpha=0.5,gamma=0.5",
    ])
    def test_invalid_params(self, descriptor):
        """Test invalid parameters raise ParamError"""
        with pytest.raises(ParamError):
            LinkFactory.create_link(descriptor)

    def test_chain_roles_must_alternate(self):
        """Test non-alternating chains are rejected"""
        with pytest.raises(ParamError, match="alternate"):
            compose_chain([("tsallis:q=0.5", "log"), ("tsallis:q=0.7", "log")])

    def test_empty_chain(self):
        """Test empty chains are rejected"""
        with pytest.raises(ParamError):
            compose_chain([])


class TestTsallisLink:
    """Test the Tsallis q-logarithm"""

    def test_log_values(self):
        """Test closed-form values"""
        assert eval_log(get_link("tsallis:q=0.7"), 1.0) == 0.0
        assert eval_log(get_link("tsallis:q=0.5"), 4.0) == pytest.approx(2.0, abs=1e-14)

    def test_exp_values(self):
        """Test closed-form values and the clip"""
        link = get_link("tsallis:q=0.5")
        assert eval_exp(link, 0.0) == 1.0
        assert eval_exp(link, 2.0) == pytest.approx(4.0, abs=1e-14)
        assert eval_exp(link, -3.0) == 0.0
        assert eval_exp(link, -2.0) == 0.0

    def test_q_limit_is_natural_log(self):
        """Test q -> 1 approaches ln"""
        link = TsallisLink(LinkFamily.of("tsallis", q=1 - 1e-10))
        assert eval_log(link, math.e) == pytest.approx(1.0, abs=1e-6)
        for q in (1 - 1e-8, 1 + 1e-8):
            near = TsallisLink(LinkFamily.of("tsallis", q=q))
            deviation = np.max(np.abs(eval_log(near, ROUNDTRIP_GRID) - np.log(ROUNDTRIP_GRID)))
            assert deviation <= 1e-5

    def test_finite_limit_at_zero(self, tsallis_link):
        """Test log(0) = -1/(1-q) for q < 1"""
        assert eval_log(tsallis_link, 0.0) == pytest.approx(-1.0 / 0.75)

    def test_divergent_log_at_zero(self):
        """Test log(0) raises where the log diverges"""
        for descriptor in ("natural", "tsallis:q=1.5", "kaniadakis1:kappa=0.5"):
            with pytest.raises(DomainError):
                eval_log(get_link(descriptor), 0.0)

    def test_negative_input(self, tsallis_link):
        """Test negative input raises DomainError"""
        with pytest.raises(DomainError):
            eval_log(tsallis_link, -0.1)

    def test_vector_evaluation(self, tsallis_link):
        """Test arrays keep their shape"""
        out = eval_log(tsallis_link, np.array([0.25, 0.5, 1.0]))
        assert isinstance(out, np.ndarray)
        assert out.shape == (3,)
        assert out[-1] == 0.0

    @settings(max_examples=50, deadline=None)
    @given(q=st.floats(min_value=0.05, max_value=0.95),
           w=st.floats(min_value=1e-6, max_value=1.0))
    def test_roundtrip_property(self, q, w):
        """Test exp(log(w)) = w across q"""
        link = TsallisLink(LinkFamily.of("tsallis", q=q))
        assert abs(eval_exp(link, eval_log(link, w)) - w) <= 1e-9 * max(1.0, w)


class TestAllFamilies:
    """Test invariants shared by every family"""

    @pytest.mark.parametrize("descriptor", ALL_FAMILIES)
    def test_unit_fixed_point(self, descriptor):
        """Test log(1) = 0 and exp(0) = 1"""
        link = get_link(descriptor)
        assert eval_log(link, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert eval_exp(link, 0.0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("descriptor", ALL_FAMILIES)
    def test_roundtrip_on_domain(self, descriptor):
        """Test exp(log(w)) = w on the validated domain"""
        link = get_link(descriptor)
        lo = max(link.domain_lo * (1 + 1e-9), 1e-6)
        grid = np.geomspace(lo, link.domain_hi, 64)
        back = np.asarray(eval_exp(link, eval_log(link, grid)))
        assert np.max(np.abs(back - grid) / np.maximum(1.0, grid)) <= 1e-9

    @pytest.mark.parametrize("descriptor", ALL_FAMILIES)
    def test_log_is_increasing(self, descriptor):
        """Test strict monotonicity"""
        link = get_link(descriptor)
        lo = max(link.domain_lo * (1 + 1e-9), 1e-6)
        values = np.asarray(eval_log(link, np.geomspace(lo, link.domain_hi, 64)))
        assert np.all(np.diff(values) > 0)


class TestDerivatives:
    """Test eval_dlink"""

    def test_tsallis_log_derivative(self):
        """Test d log_q / dw = w^-q"""
        assert eval_dlink(get_link("tsallis:q=0.5"), 1.0, LinkRole.LOG) == pytest.approx(1.0)
        assert eval_dlink(get_link("tsallis:q=0.5"), 0.25, "log") == pytest.approx(2.0)

    def test_tsallis_exp_derivative(self, tsallis_link):
        """Test d exp_q / dx at 1 for q = 0.25"""
        assert eval_dlink(tsallis_link, 1.0, LinkRole.EXP) == pytest.approx(1.75 ** (1 / 3), abs=1e-12)
        assert round(eval_dlink(tsallis_link, 1.0, "exp"), 3) == 1.205

    def test_natural_log_derivative(self, natural_link):
        """Test d ln w / dw = 1/w"""
        assert eval_dlink(natural_link, 2.0, "log") == pytest.approx(0.5)

    def test_singular_derivative(self, tsallis_link):
        """Test w^-q at 0 raises DomainError"""
        with pytest.raises(DomainError):
            eval_dlink(tsallis_link, 0.0, LinkRole.LOG)

    @pytest.mark.parametrize("descriptor", [
        'tsallis:q=0.25',
        'kaniadakis1:kappa=0.5',
        'kaniadakis3:kappa=0.5,r=0.1,lam=1.0',
        'euler:a=0.5,b=-0.5',
        'stretched_exp:alpha=0.5,gamma=2.0',
    ])
    def test_analytic_matches_finite_difference(self, descriptor):
        """Test closed-form log derivatives against central differences"""
        link = get_link(descriptor)
        grid = np.linspace(0.05, 0.9, 18)
        analytic = np.asarray(eval_dlink(link, grid, LinkRole.LOG))
        numeric = link._central_difference(link._log, grid, nonnegative=True)
        assert np.max(np.abs(analytic - numeric) / np.abs(analytic)) <= 1e-5


class TestNumericInverses:
    """Test families inverted by root finding"""

    def test_euler_inverse(self):
        """Test Euler exp inverts log"""
        link = get_link("euler:a=0.3,b=-0.2")
        assert eval_exp(link, eval_log(link, 0.3)) == pytest.approx(0.3, rel=1e-10)

    def test_kaniadakis3_inverse(self):
        """Test three-parameter Kaniadakis exp inverts log"""
        link = get_link("kaniadakis3:kappa=0.4,r=-0.2,lam=2.0")
        assert eval_exp(link, eval_log(link, 0.05)) == pytest.approx(0.05, rel=1e-10)

    def test_target_outside_bracket(self):
        """Test targets beyond the bracket image raise DomainError"""
        with pytest.raises(DomainError):
            eval_exp(get_link("euler:a=0.5,b=-0.5"), 1e4)


class TestSpecialFamilies:
    """Test the exponential families"""

    def test_super_exp_domain(self):
        """Test the Lambert branch point bounds the domain"""
        link = get_link("super_exp:alpha=0.5,gamma=1.0")
        assert link.domain_lo == pytest.approx(math.exp(-1 / math.e))
        with pytest.raises(DomainError):
            eval_log(link, 0.1)

    def test_stretched_exp_signed_power(self):
        """Test continuity and monotonicity through w = 1"""
        link = get_link("stretched_exp:alpha=0.5,gamma=2.0")
        values = eval_log(link, np.array([0.99, 1.0, 1.01]))
        assert values[0] < 0 < values[2]
        assert values[1] == 0.0


class TestChainLink:
    """Test chain link functions"""

    def test_tsallis_kaniadakis_chain(self):
        """Test q -> 1 chain reduces to arcsinh(kappa ln w)/kappa"""
        link = compose_chain([(LinkFamily.of("tsallis", q=1 - 1e-9), "log"),
                              ("kaniadakis1:kappa=0.5", "exp")])
        assert eval_log(link, math.e) == pytest.approx(math.asinh(0.5) / 0.5, abs=1e-6)
        assert round(eval_log(link, math.e), 4) == 0.9624

    def test_inverse_pair_is_identity(self):
        """Test G o G^-1 on ln w leaves ln w (where exp_q does not clip)"""
        link = compose_chain([("tsallis:q=0.3", "log"), ("tsallis:q=0.3", "exp")])
        for w in (0.3, 0.5, 0.9, 1.0):
            assert eval_log(link, w) == pytest.approx(math.log(w), abs=1e-12)

    def test_inverse_pair_clips_below_boundary(self):
        """Test the Tsallis pair floors at -1/(1-q) once exp_q clips"""
        link = compose_chain([("tsallis:q=0.3", "log"), ("tsallis:q=0.3", "exp")])
        boundary = math.exp(-1 / 0.7)
        for w in (1e-6, 0.01, 0.1, 0.99 * boundary):
            assert eval_log(link, w) == pytest.approx(-1 / 0.7, rel=1e-12)
        assert eval_log(link, 1.01 * boundary) == pytest.approx(math.log(1.01 * boundary), abs=1e-10)

    def test_chain_roundtrip(self):
        """Test exp(log(w)) = w through the composed maps"""
        link = get_link("chain:[tsallis:q=0.5>log|kaniadakis1:kappa=0.5>exp]")
        assert eval_exp(link, eval_log(link, 0.37)) == pytest.approx(0.37, abs=1e-9)

    def test_chain_lemma(self):
        """Test the chain equals the explicit nested composition"""
        link = get_link("chain:[tsallis:q=0.5>log|kaniadakis1:kappa=0.5>exp]")
        outer = get_link("tsallis:q=0.5")
        inner = get_link("kaniadakis1:kappa=0.5")
        w = np.array([0.01, 0.2, 0.7])
        expected = eval_log(outer, eval_exp(inner, np.log(w)))
        assert np.max(np.abs(eval_log(link, w) - expected)) <= 1e-10


class TestValidateParams:
    """Test validate_params"""

    def test_tsallis_admissible(self, tsallis_link):
        """Test the default Tsallis link is admissible and concave"""
        report = validate_params(tsallis_link, 256)
        assert report.admissible
        assert report.concave_log
        assert report.convex_exp

    def test_natural_admissible(self, natural_link):
        """Test ln is admissible and concave"""
        report = validate_params(natural_link, 256)
        assert report.admissible
        assert report.concave_log

    def test_stretched_exp_concavity_fails(self):
        """Test the signed-power branch is not concave near w = 1"""
        report = validate_params(get_link("stretched_exp:alpha=0.5,gamma=2.0"), 256)
        assert report.monotone
        assert not report.concave_log

    def test_grid_too_small(self, tsallis_link):
        """Test grid_size below 16 is rejected"""
        from group_md.exceptions import ArgumentError
        with pytest.raises(ArgumentError):
            validate_params(tsallis_link, 8)

    def test_report_serializes(self, tsallis_link):
        """Test to_dict carries the admissibility flag"""
        data = validate_params(tsallis_link, 32).to_dict()
        assert data['admissible'] is True
        assert data['descriptor'] == "tsallis:q=0.25"
