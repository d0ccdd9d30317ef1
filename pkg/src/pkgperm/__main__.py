import sys

from pkgperm.cli import main

sys.exit(main())
