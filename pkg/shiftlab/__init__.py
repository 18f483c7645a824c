"""
shiftlab: shift spaces over countable alphabets, extended sliding block
codes, and the inversion of the doubling chain.
"""
