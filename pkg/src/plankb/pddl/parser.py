"""PDDL domain and problem parsing (STRIPS + typing subset)."""

from __future__ import annotations

from .ast import (
    ActionSchema,
    ArityMismatch,
    Atom,
    DomainDef,
    EQUALITY_PREDICATE,
    Literal,
    OBJECT_TYPE,
    PddlSyntaxError,
    PredicateSchema,
    ProblemDef,
    TypeName,
    UnknownPredicate,
    UnknownType,
    UnsupportedConstruct,
)
from .sexpr import SList, position, read


def _err(msg: str, node) -> PddlSyntaxError:
    line, col = position(node)
    return PddlSyntaxError(msg, line, col)


def _expect_list(node, what: str) -> SList:
    if not isinstance(node, SList):
        raise _err("expected {} (a list), found '{}'".format(what, node), node)
    return node


def _expect_symbol(node, what: str) -> str:
    if isinstance(node, SList) or not isinstance(node, str):
        raise _err("expected {} (a symbol)".format(what), node)
    return str(node)


def parse_typed_list(items) -> list[tuple[str, str]]:
    """Parse `a b - t c d` style lists into (name, type) pairs."""
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    it = iter(items)
    for tok in it:
        name = _expect_symbol(tok, "a name")
        if name == "-":
            try:
                typ = _expect_symbol(next(it), "a type name")
            except StopIteration:
                raise _err("expected a type name after '-'", tok)
            out.extend((n, typ) for n in pending)
            pending = []
        else:
            pending.append(name)
    out.extend((n, OBJECT_TYPE) for n in pending)
    return out


def _parse_atom(form) -> Atom:
    lst = _expect_list(form, "an atom")
    if not lst:
        raise _err("empty atom", form)
    name = _expect_symbol(lst[0], "a predicate name")
    args = tuple(_expect_symbol(a, "a term") for a in lst[1:])
    return Atom(name, args)


def _flatten_condition(form, allow_negation: bool) -> list[Literal]:
    """Flatten a goal/precondition formula into a conjunction of literals."""
    lst = _expect_list(form, "a condition")
    if not lst:
        return []  # "(and)" and "()" both mean the empty conjunction
    head = lst[0]
    if head == "and":
        out: list[Literal] = []
        for sub in lst[1:]:
            out.extend(_flatten_condition(sub, allow_negation))
        return out
    if head == "not":
        if not allow_negation:
            raise UnsupportedConstruct("not", "negation not allowed here")
        if len(lst) != 2:
            raise _err("'not' takes exactly one argument", form)
        inner = _expect_list(lst[1], "an atom")
        if inner and inner[0] in ("and", "or", "not", "imply", "forall", "exists"):
            raise UnsupportedConstruct(str(inner[0]), "nested formula under 'not'")
        return [Literal(_parse_atom(lst[1]), negated=True)]
    if head in ("or", "imply", "forall", "exists", "when"):
        raise UnsupportedConstruct(str(head))
    return [Literal(_parse_atom(form))]


def _parse_effect(form) -> tuple[list[Atom], list[Atom]]:
    """Split an effect formula into add and delete atom lists."""
    add: list[Atom] = []
    delete: list[Atom] = []
    lst = _expect_list(form, "an effect")
    if not lst:
        return add, delete
    head = lst[0]
    if head == "and":
        for sub in lst[1:]:
            a, d = _parse_effect(sub)
            add.extend(a)
            delete.extend(d)
        return add, delete
    if head == "not":
        if len(lst) != 2:
            raise _err("'not' takes exactly one argument", form)
        delete.append(_parse_atom(lst[1]))
        return add, delete
    if head in ("when", "forall", "increase", "decrease", "assign", "scale-up", "scale-down"):
        raise UnsupportedConstruct(str(head), "in effect")
    add.append(_parse_atom(form))
    return add, delete


def _parse_action(form: SList) -> ActionSchema:
    if len(form) < 2:
        raise _err("':action' needs a name", form)
    name = _expect_symbol(form[1], "an action name")
    params: list[tuple[str, str]] = []
    precondition: list[Literal] = []
    add: list[Atom] = []
    delete: list[Atom] = []
    i = 2
    while i < len(form):
        key = _expect_symbol(form[i], "an action keyword")
        if i + 1 >= len(form):
            raise _err("'{}' needs a value".format(key), form[i])
        value = form[i + 1]
        if key == ":parameters":
            params = parse_typed_list(_expect_list(value, "a parameter list"))
            for v, _ in params:
                if not v.startswith("?"):
                    raise _err("parameter '{}' must start with '?'".format(v), value)
        elif key == ":precondition":
            precondition = _flatten_condition(value, allow_negation=True)
        elif key == ":effect":
            add, delete = _parse_effect(value)
        else:
            raise UnsupportedConstruct(key, "in action '{}'".format(name))
        i += 2
    return ActionSchema.make(name, params, precondition, add, delete)


def parse_domain(text: str) -> DomainDef:
    form = read(text)
    if len(form) < 2 or form[0] != "define":
        raise _err("expected '(define (domain ...) ...)'", form)
    head = _expect_list(form[1], "'(domain NAME)'")
    if len(head) != 2 or head[0] != "domain":
        raise _err("expected '(domain NAME)'", head)
    name = _expect_symbol(head[1], "a domain name")

    requirements: set[str] = set()
    types: list[TypeName] = []
    constants: list[tuple[str, str]] = []
    predicates: list[PredicateSchema] = []
    actions: list[ActionSchema] = []

    for section in form[2:]:
        lst = _expect_list(section, "a domain section")
        if not lst:
            raise _err("empty domain section", section)
        key = _expect_symbol(lst[0], "a section keyword")
        if key == ":requirements":
            requirements.update(_expect_symbol(r, "a requirement") for r in lst[1:])
        elif key == ":types":
            for tname, parent in parse_typed_list(lst[1:]):
                types.append(TypeName(tname, parent))
        elif key == ":constants":
            constants.extend(parse_typed_list(lst[1:]))
        elif key == ":predicates":
            for p in lst[1:]:
                plist = _expect_list(p, "a predicate declaration")
                if not plist:
                    raise _err("empty predicate declaration", p)
                pname = _expect_symbol(plist[0], "a predicate name")
                predicates.append(
                    PredicateSchema(pname, tuple(parse_typed_list(plist[1:])))
                )
        elif key == ":action":
            actions.append(_parse_action(lst))
        elif key in (":functions", ":durative-action", ":derived", ":axiom"):
            raise UnsupportedConstruct(key)
        else:
            raise _err("unknown domain section '{}'".format(key), lst[0])

    if not requirements:
        requirements.add(":strips")
    return DomainDef(
        name,
        frozenset(requirements),
        tuple(types),
        tuple(constants),
        tuple(predicates),
        tuple(actions),
    )


def _check_ground_atom(atom: Atom, domain: DomainDef, where: str) -> None:
    if not atom.is_ground():
        raise PddlSyntaxError("atom {} in {} is not ground".format(atom, where))
    if atom.predicate == EQUALITY_PREDICATE:
        if len(atom.args) != 2:
            raise ArityMismatch("'=' takes 2 arguments, got {}".format(len(atom.args)))
        return
    schema = domain.predicate_map().get(atom.predicate)
    if schema is None:
        raise UnknownPredicate(
            "unknown predicate '{}' in {}".format(atom.predicate, where)
        )
    if len(atom.args) != schema.arity:
        raise ArityMismatch(
            "predicate '{}' expects {} arguments, got {} in {}".format(
                atom.predicate, schema.arity, len(atom.args), where
            )
        )


def parse_problem(text: str, domain: DomainDef) -> ProblemDef:
    form = read(text)
    if len(form) < 2 or form[0] != "define":
        raise _err("expected '(define (problem ...) ...)'", form)
    head = _expect_list(form[1], "'(problem NAME)'")
    if len(head) != 2 or head[0] != "problem":
        raise _err("expected '(problem NAME)'", head)
    name = _expect_symbol(head[1], "a problem name")

    domain_name = ""
    objects: list[tuple[str, str]] = []
    init: list[Atom] = []
    goal: list[Literal] = []

    for section in form[2:]:
        lst = _expect_list(section, "a problem section")
        if not lst:
            raise _err("empty problem section", section)
        key = _expect_symbol(lst[0], "a section keyword")
        if key == ":domain":
            if len(lst) != 2:
                raise _err("':domain' takes one name", lst)
            domain_name = _expect_symbol(lst[1], "a domain name")
        elif key == ":objects":
            objects.extend(parse_typed_list(lst[1:]))
        elif key == ":init":
            for a in lst[1:]:
                atom = _parse_atom(a)
                _check_ground_atom(atom, domain, "init")
                init.append(atom)
        elif key == ":goal":
            if len(lst) != 2:
                raise _err("':goal' takes one formula", lst)
            goal = _flatten_condition(lst[1], allow_negation=True)
            for lit in goal:
                _check_ground_atom(lit.atom, domain, "goal")
        elif key in (":metric", ":constraints"):
            raise UnsupportedConstruct(key)
        else:
            raise _err("unknown problem section '{}'".format(key), lst[0])

    declared = domain.declared_types()
    for oname, otype in objects:
        if otype not in declared:
            raise UnknownType(
                "object '{}' has undeclared type '{}'".format(oname, otype)
            )
    return ProblemDef(
        name, domain_name, tuple(objects), frozenset(init), frozenset(goal)
    )
