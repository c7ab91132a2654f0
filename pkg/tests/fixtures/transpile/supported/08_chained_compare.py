def in_range(x):
    return 0 < x < 10
