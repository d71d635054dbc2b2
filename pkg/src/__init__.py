"""HBT Bench - single-photon correlation simulator and analysis chain."""

__version__ = "1.0.0"
__author__ = "HBT Bench Team"
__description__ = "Monte Carlo HBT bench with g2, dark-correction and lifetime analysis"
