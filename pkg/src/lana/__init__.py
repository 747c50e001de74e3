"""Annotation toolchain for answer-set programs: documentation, unit tests, lint."""
