import numpy as np


def window_frequencies(stream, window):
    """Exact window frequency vector as a dict."""
    tail = np.asarray(stream)[-window:]
    items, counts = np.unique(tail, return_counts=True)
    return dict(zip(items.tolist(), counts.tolist()))


def window_l2(stream, window):
    counts = np.array(list(window_frequencies(stream, window).values()), dtype=np.float64)
    return float(np.sqrt(np.sum(counts**2)))


def suffix_l2_all(stream):
    """norms[w - 1] is the L2 norm of the last w items, for every w."""
    counts = {}
    total = 0
    norms = np.empty(len(stream))
    for w, item in enumerate(reversed(np.asarray(stream).tolist()), start=1):
        c = counts.get(item, 0)
        counts[item] = c + 1
        total += 2 * c + 1
        norms[w - 1] = total
    return np.sqrt(norms)
