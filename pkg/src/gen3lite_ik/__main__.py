import sys

from gen3lite_ik.cli import main

sys.exit(main())
