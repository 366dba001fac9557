"""
Light cones of layered grouping schedules.

A schedule splits the qubits into groups on every layer; a group is any set of
qubits a gate (or a measurement with classical feedback) may couple. The light
cone of qubit j collects every qubit that can influence j by the end.
"""

# from the standard library
import logging
import math

_BAD_DUPLICATE_MSG = "Qubit {} appears in more than one group of layer {}"
_BAD_ARITY_MSG = "Group size k must be at least 2, got {}"


class GroupingSchedule:
    '''
    Layers of disjoint qubit groups. Qubits missing from a layer stand alone.
    '''

    def __init__(self, layers, qubits=()):
        self.qubits = set(qubits)
        for layer in layers:
            for group in layer:
                self.qubits.update(group)

        self.layers = []
        for index, layer in enumerate(layers):
            owner = {}
            groups = []
            for group in layer:
                group = frozenset(group)
                for q in group:
                    if q in owner:
                        raise ValueError(_BAD_DUPLICATE_MSG.format(q, index))
                    owner[q] = group
                groups.append(group)
            for q in self.qubits - set(owner):
                owner[q] = frozenset((q,))
                groups.append(owner[q])
            self.layers.append((groups, owner))


    @property
    def L(self):
        return len(self.layers)


    @property
    def k(self):
        return max((len(g) for groups, _ in self.layers for g in groups), default=1)


    def groups(self, layer):
        return list(self.layers[layer][0])


def light_cone(schedule, j):
    '''
    S(j): walk the layers backwards, replacing the current set by the union of
    the groups its qubits sit in
    '''
    if j not in schedule.qubits:
        raise ValueError("Qubit {} is not in the schedule".format(j))
    cone = {j}
    for _, owner in reversed(schedule.layers):
        cone = set().union(*(owner[q] for q in cone))
    return cone


def depth_lower_bound(N, k):
    '''
    log N / log k layers are needed before one qubit can depend on N others
    '''
    if k < 2:
        raise ValueError(_BAD_ARITY_MSG.format(k))
    if N < 1:
        raise ValueError("N must be positive, got {}".format(N))
    return math.log(N) / math.log(k)


def schedule_from_circuit(circuit):
    '''
    One layer per circuit layer, one group per gate support
    '''
    layers = [[gate.qubits for gate in layer] for layer in circuit.layers]
    schedule = GroupingSchedule(layers, range(circuit.num_qubits))
    logging.debug("Schedule with L=%d and k=%d from circuit", schedule.L, schedule.k)
    return schedule


def _parse_group(text):
    return [int(token) for token in text.replace(",", " ").split()]


def read_schedule_file(path):
    '''
    One layer per line, groups separated by ';', qubits within a group by
    commas or spaces. Blank lines and # comments are skipped.
    '''
    layers = []
    with open(path, "r", encoding="ascii") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                layers.append([_parse_group(group) for group in line.split(";") if group.strip()])
            except ValueError as error:
                raise ValueError("{}:{}: {}".format(path, number, error)) from error
    return GroupingSchedule(layers)


def write_schedule_file(path, schedule):
    with open(path, "w", encoding="ascii") as handle:
        for groups, _ in schedule.layers:
            handle.write("; ".join(",".join(str(q) for q in g) for g in sorted(sorted(g) for g in groups)) + "\n")
