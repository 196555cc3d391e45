"""Registry of simulation models."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..data_structure.constants import AttrType, default_height, default_width
from .exceptions import ParameterError, UnknownModel
from .world import SimAgent, World

__all__ = ['WorldParams', 'ModelDefinition', 'ModelRegistry', 'register_model']


class WorldParams(BaseModel):
    """Parameters shared by every model: the torus size."""

    model_config = ConfigDict(extra='forbid')

    width: float = Field(default=default_width, gt=0, description='World width, length units.')
    height: float = Field(default=default_height, gt=0, description='World height, length units.')


@dataclass(frozen=True)
class ModelDefinition:
    """A registered model: parameter schema, attribute schema, and pure functions.

    Attributes:
        name: model identifier used on the command line and in traces.
        params_schema: pydantic model validating the parameter table.
        attributes: attribute name -> static type, for every kind of the model.
        populate: builds the tick-0 population into an empty world.
        step: advances the world by one tick, drawing only from ``world.rng``.
        color_of: frame color of an agent.
    """

    name: str
    params_schema: Type[WorldParams]
    attributes: Mapping[str, AttrType]
    populate: Callable[[World, BaseModel], None]
    step: Callable[[World, BaseModel], None]
    color_of: Callable[[SimAgent], str]
    kinds: List[str] = field(default_factory=list)

    def validate_params(self, params: Mapping) -> WorldParams:
        """Check a parameter table against the schema.

        Raises:
            ParameterError: naming the first offending parameter.
        """
        try:
            return self.params_schema.model_validate(dict(params))
        except ValidationError as e:
            error = e.errors()[0]
            name = '.'.join(str(loc) for loc in error['loc']) or '<params>'
            value = error.get('input')
            if error['type'] == 'extra_forbidden':
                expected = f'one of {sorted(self.params_schema.model_fields)}'
            else:
                expected = error['msg']
            raise ParameterError(name=name, expected=expected, value=value) from None


class ModelRegistry:
    registered_models: Dict[str, ModelDefinition] = {}

    @classmethod
    def register(cls, definition: ModelDefinition) -> ModelDefinition:
        cls.registered_models[definition.name] = definition
        return definition

    @classmethod
    def get(cls, name: str) -> ModelDefinition:
        try:
            return cls.registered_models[name]
        except KeyError:
            raise UnknownModel(name, known=list(cls.registered_models)) from None

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls.registered_models)

    @classmethod
    def attribute_types(cls) -> Dict[str, AttrType]:
        """Union of the attribute schemas of all registered models, intrinsics included."""
        types = {'id': AttrType.num, 'kind': AttrType.sym, 'x': AttrType.num, 'y': AttrType.num}
        for definition in cls.registered_models.values():
            types.update(definition.attributes)
        return types


def register_model(
    name: str,
    params_schema: Type[WorldParams],
    attributes: Mapping[str, AttrType],
    populate: Callable[[World, BaseModel], None],
    color_of: Callable[[SimAgent], str],
    kinds: List[str],
) -> Callable:
    """Decorator registering a model step function.

    Examples:

        .. code-block:: python

            @register_model('researchers', ResearchersParams, RESEARCHER_ATTRIBUTES, populate, color_of, ['researcher'])
            def step_researchers(world: World, params: ResearchersParams) -> None:
                ...
    """

    def decorator(step: Callable[[World, BaseModel], None]) -> Callable[[World, BaseModel], None]:
        ModelRegistry.register(
            ModelDefinition(
                name=name,
                params_schema=params_schema,
                attributes=dict(attributes),
                populate=populate,
                step=step,
                color_of=color_of,
                kinds=list(kinds),
            )
        )
        return step

    return decorator
