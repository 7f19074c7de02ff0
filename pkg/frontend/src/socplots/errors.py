class SocplotsError(Exception):
    """Base class for figure-generation failures."""


class SchemaError(SocplotsError):
    """Input file does not match the documented CSV/binary layout."""


class EmptyInputError(SocplotsError):
    """Input file exists but carries no data rows."""
