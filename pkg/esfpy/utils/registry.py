from typing import Dict, Optional


class Associator[Id, Type]:
    """
    Decorator-backed registry. `associate(*ids)` files the decorated object under every id.

        associate_things = Associator[ThingId, type[Thing]]()

        @associate_things(ThingId.A, ThingId.B)
        class Thing: ...
    """

    def __init__(self, registry: Optional[Dict[Id, Type]] = None):
        self.registry = registry or dict()

    def __call__(self, *ids: Id):
        def the_types_tho(typ: Type) -> Type:
            for id in ids:
                assert id not in self.registry, f"{id} registered twice ({self.registry[id]} and {typ})"
                self.registry[id] = typ
            return typ

        return the_types_tho

    def __contains__(self, id: Id) -> bool:
        return id in self.registry

    def get(self, id: Id) -> Type:
        found = self.registry.get(id, None)
        if found is None:
            raise ValueError(f"Nothing registered for {id!r}, known: {', '.join(str(k) for k in self.registry)}")
        return found

    def ids(self):
        return list(self.registry.keys())
