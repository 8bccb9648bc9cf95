"""Tests for pnpvamp"""
