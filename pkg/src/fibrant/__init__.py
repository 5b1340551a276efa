"""Model structures on module categories from fibrantly weak factorization systems, computed exactly."""
