'''Probabilistic low depth state preparation by label state concatenation'''
