"""Unit tests for utils"""
