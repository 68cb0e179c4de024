import sys

from separt.cli import main

sys.exit(main())
