"""Command-line interface for pnpvamp"""
