from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"
E2E = FIXTURES / "e2e"
