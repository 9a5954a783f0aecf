"""Color-vision toolkit built around gray-axis rotation of linear sRGB.

Rotating colors about the gray axis gives color-vision-deficient users an
interactive cue for telling confusable colors apart; this package provides
the rotation itself, a dichromat simulation, confusion-line geometry,
delta-E color naming, discriminability analysis and a simulated-observer
psychophysics harness, plus a CLI and a local HTTP service.
"""

__version__ = "0.1.0"
