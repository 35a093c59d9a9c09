import sys

from qaware.main import main

sys.exit(main())
