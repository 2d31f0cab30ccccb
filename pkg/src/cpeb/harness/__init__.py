"""Instance generators, the batch runner and the oracle cross-check suite."""
