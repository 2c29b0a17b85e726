import json
import time

from hlink.sums import enumerate_composites

t0 = time.time()
log = []
out = enumerate_composites(log=log)
rows = []
for c in out:
    rows.append({
        "trace": c.trace,
        "crossings": c.crossings,
        "components": c.components,
        "ks_a4": c.ks_a4,
        "ks_a5": c.ks_a5,
    })
with open("_scratch_composites.json", "w") as fh:
    json.dump({"elapsed": time.time() - t0, "classes": rows,
               "log": log}, fh, indent=1)
print("done %.1fs, %d classes" % (time.time() - t0, len(out)))
