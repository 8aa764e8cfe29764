"""Pure-Python reference implementations of the hot kernels.

Letters of free-group words are nonzero ints: ``+i`` is the basis element
``a_i`` and ``-i`` its inverse.  Every function here has a drop-in compiled
twin in ``_ckernels.pyx`` with identical semantics.
"""

from __future__ import annotations


def reduce_word(word):
    out = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def substitute(word, images):
    """Replace each letter of ``word`` by its image and freely reduce."""
    out = []
    for a in word:
        if a > 0:
            piece = images[a - 1]
        else:
            piece = [-b for b in reversed(images[-a - 1])]
        for b in piece:
            if out and out[-1] == -b:
                out.pop()
            else:
                out.append(b)
    return tuple(out)


def compose_images(outer, inner):
    """Basis images of ``outer o inner`` (``inner`` acts first)."""
    return tuple(substitute(w, outer) for w in inner)


def helly_scan(masks, max_size):
    """Scan every pairwise-intersecting family of at most ``max_size`` sets.

    ``masks`` are bitmasks of vertex sets.  Returns ``(families, failures,
    first_failure)`` where ``first_failure`` is a tuple of indices into
    ``masks`` (or ``None``) whose sets meet pairwise but not jointly.
    """
    n = len(masks)
    meets = [
        frozenset(j for j in range(i + 1, n) if masks[i] & masks[j])
        for i in range(n)
    ]
    counts = [0, 0]
    first = []
    stack = []

    def extend(common, cands):
        for j in cands:
            inter = common & masks[j]
            stack.append(j)
            counts[0] += 1
            if not inter:
                counts[1] += 1
                if not first:
                    first.append(tuple(stack))
            if len(stack) < max_size:
                extend(inter, [k for k in cands if k in meets[j]])
            stack.pop()

    if max_size >= 1:
        extend(-1, list(range(n)))
    return counts[0], counts[1], (first[0] if first else None)
