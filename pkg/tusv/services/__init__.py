"""Services built on the core sieve: catalog, classifier, theorem suites and the mask cache."""
