"""Test suite"""