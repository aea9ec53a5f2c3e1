"""Import path setup for the plot-script tests.

The scripts under ``plots/`` are standalone files meant to be run directly,
so they live on no package path; put their directory on ``sys.path`` to
import them by module name here.
"""

import sys
from pathlib import Path

PLOTS_DIR = Path(__file__).resolve().parents[1]
if str(PLOTS_DIR) not in sys.path:
    sys.path.insert(0, str(PLOTS_DIR))
