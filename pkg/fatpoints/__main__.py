import sys

from fatpoints.app import main

sys.exit(main())
