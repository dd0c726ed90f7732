from tno.p5_coloring.testkit.generators import generate, generate_instance, generate_lists, random_instances
from tno.p5_coloring.testkit.oracle import brute_force_solve

__all__ = ["generate", "generate_instance", "generate_lists", "random_instances", "brute_force_solve"]
