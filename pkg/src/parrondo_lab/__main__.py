import sys

from parrondo_lab.cli import main

sys.exit(main())
