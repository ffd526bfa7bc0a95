import sys

from pyfiles.benchmark.cli import main

sys.exit(main())
