"""Art-therapy homework service: co-creative canvas, guided discussion,
therapist customization, and compiled homework history."""

__version__ = "0.1.0"
