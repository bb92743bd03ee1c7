import sys

from credalkit.cli import main

sys.exit(main())
