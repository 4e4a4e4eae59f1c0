from soctam.cli import main

raise SystemExit(main())
