'''Circuit representation, decomposition, text form, builders and light cones'''
