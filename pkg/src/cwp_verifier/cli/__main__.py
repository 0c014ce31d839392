import sys

from cwp_verifier.cli.main import main

sys.exit(main())
