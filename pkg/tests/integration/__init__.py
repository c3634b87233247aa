"""Integration tests"""