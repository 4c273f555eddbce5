import sys

from .surveyor import main

sys.exit(main())
