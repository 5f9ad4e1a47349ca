"""
Apps del toolkit espectral de mKdV.
"""
