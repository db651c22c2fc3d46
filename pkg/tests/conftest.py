from opendicke.model import BathSpec, ModelParams


def make(omega_a=1.0, omega_b=1.0, g=0.0, ga=0.0, gb=0.0, sa=0.0, sb=0.0) -> ModelParams:
    return ModelParams(omega_a, omega_b, g, BathSpec(ga, sa), BathSpec(gb, sb))
