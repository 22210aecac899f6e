"""Entry point for python -m cifboot."""

from .cli import main

if __name__ == "__main__":
    main()
