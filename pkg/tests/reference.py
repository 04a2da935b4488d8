"""Hand-written scalar evaluators used as oracles for the kernels."""
import math


def u(x, a, k, m):
    if x > a:
        return k * (x - a) ** m
    if x < -a:
        return k * (-x - a) ** m
    return 0.0


def f1(x):
    return sum(v * v for v in x)


def f2(x):
    return sum(abs(v) for v in x) + math.prod(abs(v) for v in x)


def f3(x):
    total = 0.0
    for i in range(len(x)):
        inner = 0.0
        for j in range(i + 1):
            inner += x[j]
        total += inner * inner
    return total


def f4(x):
    return max(abs(v) for v in x)


def f5(x):
    return sum(100 * (x[i + 1] - x[i] ** 2) ** 2 + (x[i] - 1) ** 2 for i in range(len(x) - 1))


def f6(x):
    return sum(math.floor(x[i] + 0.5) ** 2 for i in range(len(x) - 1))


def f7(x):
    return sum((i + 1) * v**4 for i, v in enumerate(x))


def f8(x):
    return 418.9829 * len(x) - sum(v * math.sin(math.sqrt(abs(v))) for v in x)


def f9(x):
    return sum(v * v - 10 * math.cos(2 * math.pi * v) + 10 for v in x)


def f10(x):
    d = len(x)
    a = math.sqrt(sum(v * v for v in x) / d)
    b = sum(math.cos(2 * math.pi * v) for v in x) / d
    return -20 * math.exp(-0.2 * a) - math.exp(b) + 20 + math.e


def f11(x):
    s = sum(v * v for v in x) / 4000
    p = 1.0
    for i, v in enumerate(x):
        p *= math.cos(v / math.sqrt(i + 1))
    return s - p + 1


def f12(x):
    d = len(x)
    y = [1 + (v + 1) / 4 for v in x]
    s = 10 * math.sin(math.pi * y[0]) ** 2
    for i in range(d - 1):
        s += (y[i] - 1) ** 2 * (1 + 10 * math.sin(math.pi * y[i + 1]) ** 2)
    s += (y[-1] - 1) ** 2
    return math.pi / d * s + sum(u(v, 10, 100, 4) for v in x)


def f13(x):
    d = len(x)
    s = math.sin(3 * math.pi * x[0]) ** 2
    for i in range(d - 1):
        s += (x[i] - 1) ** 2 * (1 + math.sin(3 * math.pi * x[i + 1]) ** 2)
    s += (x[-1] - 1) ** 2 * (1 + math.sin(2 * math.pi * x[-1]) ** 2)
    return 0.1 * s + sum(u(v, 5, 100, 4) for v in x)


REFERENCE = {f"F{i}": f for i, f in enumerate([f1, f2, f3, f4, f5, f6, f7, f8, f9, f10, f11, f12, f13], 1)}
