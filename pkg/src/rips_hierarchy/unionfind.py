class UnionFind:
    """Disjoint sets over 0..n-1 whose root is always the least member.

    Least-index roots give every block a canonical name for free, which the
    hierarchy uses as the component identity across scales.
    """

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        """Merge the blocks of a and b; return the surviving root, or None if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra
