"""
RZF-SKETCH - Sketched Regularized Zero-Forcing Beamforming

Library and experiment harness for computing downlink RZF beamformers
through a sketch-preconditioned Richardson iteration, with exact oracles,
bound evaluators and seeded Monte-Carlo scenarios.

Version: 1.0.0
License: MIT
"""

__version__ = "1.0.0"
__description__ = "Sketched regularized zero-forcing beamforming"

# Don't import everything to avoid circular imports
# Components should be imported explicitly when needed
