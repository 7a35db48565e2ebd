"""Symulator przechodzenia po ścieżkach własnych z poissonizacją kroków.

Moduły:
- `linalg`: rozkłady spektralne, równania Sylvestera, pochodne funkcji macierzowych
- `spectral`: okna spektralne, rzuty, operacja twiddle i ograniczenia norm
- `paths`: ścieżki hamiltonianów (Grover, układy liniowe) i ścieżki unitarne
- `dynamics`: generatory, całkowanie równania marginalnego, koszt
- `stochastic`: proces Poissona, trajektorie Monte-Carlo
- `schedules`: harmonogramy częstości, stałe założeń i ograniczenia niewierności
- `experiments`, `reporting`, `cli`: przebiegi wsadowe i zapis wyników
"""

__all__ = [
	"dynamics",
	"experiments",
	"linalg",
	"paths",
	"reporting",
	"schedules",
	"shared",
	"spectral",
	"stochastic",
]
