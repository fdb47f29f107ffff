"""tempalign: portfolio temperature alignment with uncertainty quantification."""

__version__ = "0.1.0"
