"""python -m knotselect"""
from knotselect.cli import main

main()
