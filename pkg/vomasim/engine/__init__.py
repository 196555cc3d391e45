from .exceptions import EngineError, ModelPanic, ParameterError, UnknownModel
from .registry import ModelDefinition, ModelRegistry, WorldParams, register_model
from .world import SimAgent, World, make_rng, neighbors_within, toroidal_distance, wrap_coordinate
from .runner import config_run_id, init_world, make_run_id, run_simulation, run_to_directory, step_model
