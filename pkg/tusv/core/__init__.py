"""Core number-theoretic primitives: generators, form grammar and the sieve."""
