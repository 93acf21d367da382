"""Brute-force reference computations

Everything in here is exponential and size-gated through the ORACLE_*
configuration ceilings. Used by the test suite and the verify command.
"""
