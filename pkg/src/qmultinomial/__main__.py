import sys

from qmultinomial.cli import main

sys.exit(main())
