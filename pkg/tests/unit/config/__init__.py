"""Unit tests for config"""
