# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_pykernels``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t


def reduce_word(word):
    cdef Py_ssize_t n = len(word), top = 0, i
    cdef long a
    cdef long *buf = <long *> malloc((n + 1) * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            a = word[i]
            if top > 0 and buf[top - 1] == -a:
                top -= 1
            else:
                buf[top] = a
                top += 1
        return tuple([buf[i] for i in range(top)])
    finally:
        free(buf)


cdef Py_ssize_t _push_image(long *buf, Py_ssize_t top, tuple piece, bint invert):
    cdef Py_ssize_t k, m = len(piece)
    cdef long b
    for k in range(m):
        if invert:
            b = -<long> piece[m - 1 - k]
        else:
            b = <long> piece[k]
        if top > 0 and buf[top - 1] == -b:
            top -= 1
        else:
            buf[top] = b
            top += 1
    return top


def substitute(word, images):
    cdef Py_ssize_t n = len(word), top = 0, i, total = 1
    cdef long a
    cdef long *buf
    for a in word:
        total += len(images[a - 1 if a > 0 else -a - 1])
    buf = <long *> malloc(total * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            a = word[i]
            if a > 0:
                top = _push_image(buf, top, <tuple> images[a - 1], False)
            else:
                top = _push_image(buf, top, <tuple> images[-a - 1], True)
        return tuple([buf[i] for i in range(top)])
    finally:
        free(buf)


def compose_images(outer, inner):
    return tuple([substitute(w, outer) for w in inner])


cdef void _scan(uint64_t *masks, char *meets, Py_ssize_t n, uint64_t common,
                Py_ssize_t *cands, Py_ssize_t ncand, Py_ssize_t depth,
                Py_ssize_t max_size, Py_ssize_t *stack, long long *counts,
                Py_ssize_t *first, Py_ssize_t *first_len):
    cdef Py_ssize_t c, j, k, nnext, t
    cdef uint64_t inter
    cdef Py_ssize_t *nxt
    for c in range(ncand):
        j = cands[c]
        inter = common & masks[j]
        stack[depth] = j
        counts[0] += 1
        if inter == 0:
            counts[1] += 1
            if first_len[0] == 0:
                for t in range(depth + 1):
                    first[t] = stack[t]
                first_len[0] = depth + 1
        if depth + 1 < max_size:
            nxt = cands + ncand
            nnext = 0
            for k in range(c + 1, ncand):
                if meets[j * n + cands[k]]:
                    nxt[nnext] = cands[k]
                    nnext += 1
            if nnext:
                _scan(masks, meets, n, inter, nxt, nnext, depth + 1, max_size,
                      stack, counts, first, first_len)


def helly_scan(masks, max_size):
    cdef Py_ssize_t n = len(masks), i, j, m = max_size
    cdef long long counts[2]
    cdef Py_ssize_t first_len = 0
    if n == 0 or m < 1:
        return 0, 0, None
    if any(x < 0 or x >= (1 << 64) for x in masks):
        raise ValueError("masks must fit in 64 bits")
    cdef uint64_t *cm = <uint64_t *> malloc(n * sizeof(uint64_t))
    cdef char *meets = <char *> malloc(n * n)
    # candidate lists for every depth are carved from one buffer
    cdef Py_ssize_t *cands = <Py_ssize_t *> malloc(n * (m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *stack = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *first = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    if cm == NULL or meets == NULL or cands == NULL or stack == NULL or first == NULL:
        free(cm); free(meets); free(cands); free(stack); free(first)
        raise MemoryError()
    try:
        for i in range(n):
            cm[i] = <uint64_t> masks[i]
        for i in range(n):
            for j in range(n):
                meets[i * n + j] = (j > i) and (cm[i] & cm[j]) != 0
            cands[i] = i
        counts[0] = 0
        counts[1] = 0
        _scan(cm, meets, n, <uint64_t> ~(<uint64_t> 0), cands, n, 0, m,
              stack, counts, first, &first_len)
        witness = tuple([first[i] for i in range(first_len)]) if first_len else None
        return counts[0], counts[1], witness
    finally:
        free(cm); free(meets); free(cands); free(stack); free(first)
