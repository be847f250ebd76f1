from homsim.cli import main

raise SystemExit(main())
