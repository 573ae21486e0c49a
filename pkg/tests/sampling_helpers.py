from fractions import Fraction


def random_values(rnd, count: int, ring: str, density: float = 0.6) -> list:
    out = []
    for _ in range(count):
        if rnd.random() > density:
            out.append(0)
        elif ring == "Z2":
            out.append(1)
        elif ring == "Z":
            out.append(rnd.randint(-3, 3))
        else:
            out.append(Fraction(rnd.randint(-6, 6), rnd.choice((1, 2, 3, 4))))
    return out
