import sys

from bpsloc.cli import main

sys.exit(main())
