"""DAOs for liemaps."""

from .dao import DAO, CsvStorage
