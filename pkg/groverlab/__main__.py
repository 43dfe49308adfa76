from groverlab.main import main

raise SystemExit(main())
