"""Write a system as text, parse it, run it, and print it back canonically."""
from snpcrypt import parse_system, render_system, run

TEXT = """
# a neuron that fires every other step until it runs dry
system blinker {
  neuron src { spikes = 4; (a^2)+ / a^2 -> a; 1; }
  neuron out { spikes = 0; a -> a; 0; a^2 -> lambda; }
  syn { src -> out; }
  out out;
}
"""

system = parse_system(TEXT)
print(render_system(system, name="blinker"))
print("output spikes at", run(system, budget=50).emissions)
assert parse_system(render_system(system)) == system
