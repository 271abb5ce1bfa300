"""Cat-state amplification in circuit QED: theory and open-system simulation.

Unit conventions used throughout:

* time in microseconds,
* angular frequencies in rad/us (so a linear frequency f in MHz corresponds
  to an angular frequency 2*pi*f rad/us),
* hbar = 1.

The constants ``GHZ``, ``MHZ`` and ``KHZ`` convert linear frequencies quoted
in those units to angular frequencies in rad/us.
"""

import numpy as np

GHZ = 2.0 * np.pi * 1.0e3   # rad/us per GHz of linear frequency
MHZ = 2.0 * np.pi           # rad/us per MHz
KHZ = 2.0 * np.pi * 1.0e-3  # rad/us per kHz

__version__ = "0.1.0"

__all__ = ["GHZ", "MHZ", "KHZ", "__version__"]
