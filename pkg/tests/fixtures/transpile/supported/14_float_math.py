def scale(a: float) -> float:
    return (a * 1.5 - 0.25) / 2.0
