"""
Q-Aware L2O - Optimizador aprendido con geometría cuántica para algoritmos variacionales
"""
__version__ = "1.0.0"
