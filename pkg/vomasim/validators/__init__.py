from .connectivity import UnionFind, components_of, connected_components
from .exceptions import NonSpatialVoAgent
from .proximity import proximity_report
