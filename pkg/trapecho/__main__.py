import sys

from trapecho.launchers.cli import main

sys.exit(main())
