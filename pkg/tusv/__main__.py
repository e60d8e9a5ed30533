import sys

from tusv.cli.main import main

sys.exit(main())
