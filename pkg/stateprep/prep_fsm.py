"""
The finite state machine run at every node of a preparation tree.

    Prepare -> Transform -> Output
                  |
                  +-> Retry -> Prepare    (no copies came out and the
                                           algorithm retries the subtree)

A driver object supplies the work: is_leaf(node), prepare_leaf(node),
prepare_children(node), transform(node, a, b), on_retry(node) and the flag
retries. Work happens in __call__ so a long run of retries loops in run_node
instead of nesting calls.

Inspired by @cmcginty's answer at
https://stackoverflow.com/questions/2101961/python-state-machine-design
"""

# from standard library
import logging


def node_label(path):
    return "".join(str(bit) for bit in path) or "root"


class NodeState(object):
    """The parent state for all node states."""

    def __init__(self, driver, node):
        self.driver = driver
        self.node = node
        self.inputs = None
        self.result = None
        self.elapsed = 0
        self.restarts = 0
        self.done = False
        self.on_enter()

    # Transition the FSM to another state, and invoke the on_enter()
    # method for the new state.
    def next_state(self, cls):
        logging.debug("Node {0} transition : {1} -> {2}".format(node_label(self.node.path), self.__class__.__name__, cls.__name__))
        self.__class__ = cls
        self.on_enter()


    def on_enter(self):
        pass


class Prepare(NodeState):
    """
    Build the leaf copies, or run both children to completion
    """
    def __call__(self):
        if self.driver.is_leaf(self.node):
            self.result = self.driver.prepare_leaf(self.node)
            self.elapsed += self.result.time
            self.next_state(Output)
        else:
            a, b, elapsed = self.driver.prepare_children(self.node)
            self.elapsed += elapsed
            self.restarts += a.restarts + b.restarts
            self.inputs = (a, b)
            self.next_state(Transform)


class Transform(NodeState):
    """
    One concatenation batch over the paired copies of the children
    """
    def __call__(self):
        self.result, charge = self.driver.transform(self.node, *self.inputs)
        self.elapsed += charge
        if self.result.count == 0 and self.driver.retries:
            self.next_state(Retry)
        else:
            self.next_state(Output)


class Retry(NodeState):
    """
    The batch produced nothing; both halves are prepared again
    """
    def __call__(self):
        self.next_state(Prepare)

    def on_enter(self):
        self.restarts += 1
        self.inputs = None
        self.driver.on_retry(self.node)


class Output(NodeState):
    """
    Terminal state, the result carries the node's elapsed steps and restarts
    """
    def __call__(self):
        pass

    def on_enter(self):
        self.result.time = self.elapsed
        self.result.restarts = self.restarts
        self.done = True


def run_node(driver, node):
    state = Prepare(driver, node)
    while not state.done:
        state()
    return state.result
