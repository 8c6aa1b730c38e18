"""Physical constants and unit conversions (CGS-Gaussian).

The physics core works in CGS-Gaussian units, where gamma**2 * hbar / r**3
is directly an angular frequency.  Lengths are accepted in nm at the API
boundary and converted to cm internally.
"""

HBAR_ERG_S = 1.054571817e-27
"""Reduced Planck constant (erg s)."""

GAMMA_PROTON = 2.6752218744e4
"""Proton gyromagnetic ratio (rad s^-1 G^-1)."""

NM3_TO_CM3 = 1e-21
"""Volume conversion, cubic nanometres to cubic centimetres."""

NM3_PER_CM3 = 1e21
"""Concentration conversion, nm^-3 to cm^-3."""
