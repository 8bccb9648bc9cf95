"""Utility modules for pnpvamp: constants, errors, seeds, metrics, CSV and logging"""
