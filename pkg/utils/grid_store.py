import logging
from functools import lru_cache

from utils.errors import DomainError
from utils.field_grids import figure_grid, figure_shape

logger = logging.getLogger(__name__)

MAX_GRID_CELLS = 1 << 20


class GridStore:
    """In-process cache of figure grids served by the API."""

    def __init__(self, threads=1, max_entries=32, max_cells=MAX_GRID_CELLS):
        self.threads = threads
        self.max_entries = max_entries
        self.max_cells = max_cells
        self._figure = lru_cache(maxsize=max_entries)(self._build)

    def _build(self, figure, k, n_x, n_y):
        logger.info("Sampling figure %s grid (k=%s, %sx%s)...", figure, k, n_x, n_y)
        return figure_grid(figure, k=k, n_x=n_x, n_y=n_y, threads=self.threads)

    def figure(self, figure, k=1.0, n_x=None, n_y=None):
        """Returns the cached grid for the figure preset, sampling it on first use.

        Grids larger than ``max_cells`` are refused before any sampling.
        """
        cells_x, cells_y = figure_shape(figure, n_x, n_y)
        if cells_x * cells_y > self.max_cells:
            raise DomainError(
                f"grid of {cells_x}x{cells_y} cells exceeds the limit of {self.max_cells}"
            )
        return self._figure(int(figure), float(k), n_x, n_y)

    def cache_info(self):
        return self._figure.cache_info()

    def refresh(self):
        """Drops every cached grid."""
        logger.info("Refreshing grid store...")
        self._figure.cache_clear()
