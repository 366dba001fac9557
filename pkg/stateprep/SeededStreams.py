"""
Reproducible random streams.

Every stream is a numpy Generator built from SeedSequence(seed, spawn_key=key),
so a stream depends only on the root seed and its key, never on the order in
which streams were created.
"""

# third party
import numpy as np


class SeededStreams:
    '''
    Generators keyed by tuples of non-negative integers under one root seed
    '''

    def __init__(self, seed, key=()):
        if seed < 0:
            raise ValueError("Seeds must be non-negative, got {}".format(seed))
        self._seed = int(seed)
        self._key = tuple(int(k) for k in key)
        self._nodes = {}


    @property
    def seed(self):
        return self._seed


    @property
    def key(self):
        return self._key


    def generator(self):
        return np.random.default_rng(np.random.SeedSequence(self._seed, spawn_key=self._key))


    def fork(self, *key):
        '''
        Child streams for sub-tasks, e.g. fork(chunk_index)
        '''
        return SeededStreams(self._seed, self._key + tuple(key))


    def node(self, path):
        '''
        The cached generator of one preparation tree node.

        @param path - tuple of bits from the root, 0 for the first half
        '''
        path = tuple(path)
        if path not in self._nodes:
            # path length first keeps nodes of different depths apart
            self._nodes[path] = np.random.default_rng(
                np.random.SeedSequence(self._seed, spawn_key=self._key + (len(path),) + path))
        return self._nodes[path]
