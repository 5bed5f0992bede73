"""Knowledge-based legal document assembly.

Rule-driven reasoning over interview answers, template rendering into
semantically marked-up XML, and argument graphs explaining every
generated statement.
"""

__version__ = "0.1.0"
