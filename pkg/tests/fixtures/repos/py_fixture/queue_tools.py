"""Simple queue helpers."""

from collections import deque


def make_queue(items):
    """Create a queue from items."""
    return deque(items)


def drain(queue):
    out = []
    while queue:
        out.append(queue.popleft())
    return out


def windowed(queue, size):
    """Yield fixed-size windows.

    Keeps a rolling buffer internally.
    """
    def take(n):
        return [queue.popleft() for _ in range(n)]

    while len(queue) >= size:
        yield take(size)
