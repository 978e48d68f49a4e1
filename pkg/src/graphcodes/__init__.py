"""Random quantum graph codes for the quantum erasure channel."""
