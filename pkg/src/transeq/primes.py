"""Primality testing and random prime sampling."""

_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Miller–Rabin; the fixed bases make it deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, upper, lower=2, attempts=100000):
    """Uniform candidates in [lower, upper) until one is prime."""
    if upper <= lower:
        raise ValueError("empty interval")
    for _ in range(attempts):
        n = rng.randrange(lower, upper)
        if is_prime(n):
            return n
    raise RuntimeError(f"no prime found in [{lower}, {upper}) after {attempts} draws")
