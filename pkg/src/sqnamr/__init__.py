"""Two-mode squeezing of two nanomechanical resonators coupled through a dc-SQUID."""

__version__ = "0.1.0"
