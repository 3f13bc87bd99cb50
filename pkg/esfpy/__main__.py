import sys

from esfpy.cli import main

sys.exit(main())
