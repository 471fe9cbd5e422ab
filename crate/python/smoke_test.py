"""Quick check that the extension module imports and answers sensibly."""

import json

import monotri

strip = monotri.Coloring.from_json('{"type":"strip","scale":1.0,"boundary_rule":"upper-closed"}')
assert strip.kind == "strip"
assert strip.color(0.0, 0.5) == "black"
assert strip.color(0.0, 1.5) == "white"
assert abs(strip.boundary_distance(0.0, 0.25) - 0.25) < 1e-12

again = monotri.Coloring.from_json(strip.to_json())
assert all(again.color(x / 7, y / 3) == strip.color(x / 7, y / 3) for x in range(-20, 20) for y in range(-20, 20))

verdict = monotri.forcing((1.0, 1.0, 1.0), "i")
assert verdict["verified"] and verdict["tested_colorings"] == 32

sol = monotri.lines("-0.57735026918962576,0", "0.57735026918962576,0", "vertical:0")
assert sol["kind"] == "DegenerateConcurrent"

out = monotri.find_copy(strip, (1.0, 1.0, 1.0), region=(0.0, 0.0, 4.0, 4.0), step=0.1, angles=360)
assert out["result"] == "exhausted", out

zebra = monotri.Coloring.from_json('{"type":"zebra","profile":[[0,0],[0.5,0.1],[1,0]]}')
report = monotri.check_zebra(zebra)
assert all(report[k]["passed"] for k in "abcd"), json.dumps(report)

hexa = monotri.hexagon(zebra, (0.25, 0.05))
assert hexa["regular"] and len(hexa["points"]) == 6

pair = monotri.almost(strip, 0.1, seed=7)
assert pair["result"] == "found", pair

assert monotri.render(strip).startswith("<?xml")
print("smoke test passed")
