"""Irreducibility and stability of binomials x^d - a over finite fields."""
