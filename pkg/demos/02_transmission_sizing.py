"""Hand sizing of a hydrostatic transmission, then a dynamic check.

The steady-state calculation picks a motor for the load torque at an
assumed working pressure and a pump to feed it at the target speed. The
dynamic model then shows what speed those units actually deliver.
"""

from fluidtabu.experiment import format_sizing, sizing_report
from fluidtabu.hydraulics import TransmissionParams, simulate_transmission, steady_state_extract

rows = sizing_report(compare=(200.0, 1000.0))
print(format_sizing(rows))

for name, r in rows.items():
    p = TransmissionParams(r["pump_displacement"], r["motor_displacement"])
    m = steady_state_extract(simulate_transmission(p))
    print(f"{name:10s} simulated speed {m.speeds[0]:8.2f} r/min, "
          f"pressure {m.pressure_drops[0]:6.2f} bar, relief {m.relief_flow:.3f} L/min")
