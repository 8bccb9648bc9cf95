"""Configuration modules for pnpvamp: environment settings and experiment configs"""
