"""Watch the three-neuron adder compute t1*k + t2 in spike time.

The answer is the gap between the output neuron's two spikes.
"""
from snpcrypt import LinParams, build_pi_add, linfun_oracle, run

params = LinParams(t1=3, t2=2, k=4)
system = build_pi_add(params)


def show(ev):
    parts = [f"fire {n}" for n, _ in ev.fired] + [f"emit {n}" for n in ev.emitted]
    if parts:
        print(f"  t={ev.time:>2}: " + ", ".join(parts))


trace = run(system, budget=100, on_step=show)
print("output spikes at", trace.emissions)
print("interval", trace.intervals[0], "closed form", linfun_oracle(params))

# The event engine skips quiet stretches, so large delays cost nothing extra.
big = LinParams(t1=10**6, t2=17, k=9)
fast = run(build_pi_add(big), budget=1000, mode="events")
print(f"t1=10^6: interval {fast.intervals[0]} after {fast.events} events")
