"""Sibling-property Huffman trees.

Nodes live in one list ordered bottom-up and left to right: weights are
nondecreasing with position, siblings occupy positions (2k, 2k + 1) and the
root is last. The even position takes bit 0, except in a pair that joins an
internal node with a leaf, where the leaf takes bit 0. Encoding walks parent
links from a leaf, decoding walks ``first`` links from the root.
"""
import logging
from fractions import Fraction

from weights.exceptions import EmptyModelError, UnknownSymbolError

logger = logging.getLogger(__name__)


class Node:
    __slots__ = ('weight', 'symbol', 'parent', 'first', 'order')

    def __init__(self, weight, symbol=None):
        self.weight = weight
        self.symbol = symbol
        self.parent = None
        # Position of the left child; None for leaves.
        self.first = None
        self.order = 0

    @property
    def is_leaf(self):
        return self.first is None

    def __repr__(self):
        if self.is_leaf:
            return f"Leaf({self.symbol}, {self.weight})"
        return f"Node({self.weight})"


class HuffmanTree:
    def __init__(self, weights, keep_zero=False):
        self.keep_zero = keep_zero
        self.rebuilds = 0
        self._build(weights)

    def _build(self, weights):
        """Two-queue Huffman construction.

        Leaves are taken by (weight, descending symbol); a leaf wins a tie
        against an internal node; internal nodes leave in creation order.
        """
        if not weights:
            raise EmptyModelError("cannot build a code tree without symbols")
        leaves = [Node(weight, symbol) for symbol, weight in weights.items()]
        leaves.sort(key=lambda node: (node.weight, -node.symbol))
        internal = []
        nodes = []
        li = ii = 0

        def take():
            nonlocal li, ii
            if ii >= len(internal) or (li < len(leaves) and leaves[li].weight <= internal[ii].weight):
                node = leaves[li]
                li += 1
            else:
                node = internal[ii]
                ii += 1
            node.order = len(nodes)
            nodes.append(node)
            return node

        while (len(leaves) - li) + (len(internal) - ii) > 1:
            left = take()
            right = take()
            parent = Node(left.weight + right.weight)
            parent.first = left.order
            left.parent = right.parent = parent
            internal.append(parent)
        take()

        self.nodes = nodes
        self.leaf_of = {node.symbol: node for node in leaves}

    def rebuild(self):
        weights = {symbol: leaf.weight for symbol, leaf in self.leaf_of.items()}
        self.rebuilds += 1
        logger.debug("rebuilding code tree over %d leaves", len(weights))
        self._build(weights)

    @property
    def root(self):
        return self.nodes[-1]

    def __contains__(self, symbol):
        return symbol in self.leaf_of

    def __len__(self):
        return len(self.leaf_of)

    def leaf_weights(self):
        return {symbol: leaf.weight for symbol, leaf in sorted(self.leaf_of.items())}

    def codeword(self, symbol):
        try:
            node = self.leaf_of[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol} is not in the code tree") from None
        bits = []
        while node.parent is not None:
            bits.append((node.order & 1) ^ self._flipped(node.parent))
            node = node.parent
        bits.reverse()
        return bits

    def _flipped(self, parent):
        return not self.nodes[parent.first].is_leaf and self.nodes[parent.first + 1].is_leaf

    def child(self, parent, bit):
        return self.nodes[parent.first + (bit ^ self._flipped(parent))]

    def depth(self, symbol):
        return len(self.codeword(symbol))

    def code_lengths(self):
        return {symbol: self.depth(symbol) for symbol in sorted(self.leaf_of)}

    def weighted_path_length(self):
        """Sum of weight * depth over the leaves: the bits this tree spends on its own weights."""
        return sum(leaf.weight * self.depth(symbol) for symbol, leaf in self.leaf_of.items())

    def check_invariants(self, exact=True):
        nodes = self.nodes
        for position, node in enumerate(nodes):
            if node.order != position:
                raise AssertionError(f"node at {position} records position {node.order}")
            if position and nodes[position - 1].weight > node.weight:
                raise AssertionError(f"weights decrease at position {position}")
            if not node.is_leaf:
                left, right = nodes[node.first], nodes[node.first + 1]
                if node.first % 2 or left.parent is not node or right.parent is not node:
                    raise AssertionError(f"broken sibling pair under position {position}")
                if exact and left.weight + right.weight != node.weight:
                    raise AssertionError(f"node at {position} is not the sum of its children")
        if len(nodes) != 2 * len(self.leaf_of) - 1 or self.root.parent is not None:
            raise AssertionError("tree shape does not match its leaf count")
        if len(self.leaf_of) > 1:
            kraft = sum(Fraction(1, 1 << self.depth(symbol)) for symbol in self.leaf_of)
            if kraft != 1:
                raise AssertionError(f"Kraft sum is {kraft}")
        return True

    def _swap(self, u, v):
        """Exchange two nodes' places (positions and parents); subtrees move with them."""
        nodes = self.nodes
        nodes[u.order], nodes[v.order] = v, u
        u.order, v.order = v.order, u.order
        u.parent, v.parent = v.parent, u.parent
        for node in (u, v):
            if not node.is_leaf:
                nodes[node.first].parent = node
                nodes[node.first + 1].parent = node

    @staticmethod
    def _is_ancestor(node, of):
        walker = of.parent
        while walker is not None:
            if walker is node:
                return True
            walker = walker.parent
        return False

    def _related(self, a, b):
        return self._is_ancestor(a, b) or self._is_ancestor(b, a)

    def _raise(self, leaf, delta, touched):
        nodes = self.nodes
        node = leaf
        while node is not None:
            weight = node.weight
            top = node.order
            while top + 1 < len(nodes) and nodes[top + 1].weight == weight:
                top += 1
            while top > node.order and self._related(nodes[top], node):
                top -= 1
            if top != node.order:
                self._swap(node, nodes[top])
            node.weight = weight + delta
            touched.append(node)
            node = node.parent

    def _lower(self, leaf, delta, touched):
        nodes = self.nodes
        node = leaf
        needs_rebuild = False
        while node is not None:
            weight = node.weight
            bottom = node.order
            while bottom > 0 and nodes[bottom - 1].weight == weight:
                bottom -= 1
            if bottom != node.order:
                if self._related(node, nodes[bottom]):
                    needs_rebuild = True
                else:
                    self._swap(node, nodes[bottom])
            node.weight = weight - delta
            touched.append(node)
            node = node.parent
        return needs_rebuild

    def _sorted_around(self, touched):
        nodes = self.nodes
        for node in touched:
            position = node.order
            if position and nodes[position - 1].weight > node.weight:
                return False
            if position + 1 < len(nodes) and node.weight > nodes[position + 1].weight:
                return False
        return True

    def change_weight(self, symbol, new_weight):
        """Set a leaf's weight, restoring the sibling property by block swaps or a rebuild."""
        try:
            leaf = self.leaf_of[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol} is not in the code tree") from None
        delta = new_weight - leaf.weight
        if not delta:
            return self
        if new_weight == 0 and not self.keep_zero:
            del self.leaf_of[symbol]
            logger.debug("symbol %s left the model", symbol)
            if not self.leaf_of:
                self.nodes = []
                return self
            self.rebuild()
            return self

        touched = []
        if delta > 0:
            needs_rebuild = False
            self._raise(leaf, delta, touched)
        else:
            needs_rebuild = self._lower(leaf, -delta, touched)
        if needs_rebuild or not self._sorted_around(touched):
            self.rebuild()
        return self


def build_tree(table):
    """A Huffman tree over the table's coding alphabet."""
    return HuffmanTree(table.weights, keep_zero=table.keep_zero)


def encode_symbol(tree, symbol, out):
    out.extend(tree.codeword(symbol))


def decode_symbol(tree, stream):
    if not tree.nodes:
        raise EmptyModelError("cannot decode from an empty code tree")
    node = tree.root
    while not node.is_leaf:
        node = tree.child(node, stream.read())
    return node.symbol


def change_weight(tree, symbol, new_weight):
    return tree.change_weight(symbol, new_weight)
