"""Import the installed packages before test collection.

The plotkit project directory shares its name with the plotkit import
package.  Binding the installed package in sys.modules first keeps pytest's
importlib import mode from registering the bare project directory under the
same name when it imports plotkit/tests/*.
"""

import maglev_sensorless  # noqa: F401
import plotkit  # noqa: F401
