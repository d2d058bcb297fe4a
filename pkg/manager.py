"""Entrypoint for CLI

Available commands:

1. Build a Lie map from a polynomial system.

   ```shell
   python manager.py maps build_map liemaps/resources/vdp_system.json --dt=0.01 --order=3 --output=map.json
   ```

2. Iterate a map from an initial state.
   ```shell
   python manager.py maps simulate map.json --x0=-2,4 --steps=1000 --output=trajectory.csv
   ```

3. Fit a map to a trajectory.
   ```shell
   python manager.py maps fit trajectory.csv --order=3 --output=fitted.json --report=fit_report.json
   ```

4. Run the benchmarks.
   ```shell
   python manager.py bench vdp --orders=3,5,7
   python manager.py bench burgers --snapshot_dir=reports
   ```
"""
from liemaps import main

if __name__ == "__main__":
    main()
