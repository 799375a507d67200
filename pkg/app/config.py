import logging
import os

from dotenv import load_dotenv

load_dotenv()

# Base de datos: SQLite por defecto
DEFAULT_SQLITE_PATH = "/tmp/connscan.db" if os.path.exists("/tmp") else "./connscan.db"
DATABASE_URL = os.getenv("DATABASE_URL", f"sqlite:///{DEFAULT_SQLITE_PATH}")

LOG_LEVEL = os.getenv("CONNSCAN_LOG_LEVEL", "INFO")

# Parámetros por defecto de las consultas
DEFAULT_LEG_MAX = int(os.getenv("CONNSCAN_LEG_MAX", "8"))
DEFAULT_MAX_DELAY = int(os.getenv("CONNSCAN_MAX_DELAY", "3600"))
DEFAULT_ALPHA = float(os.getenv("CONNSCAN_ALPHA", "2.0"))
ORACLE_MAX_CONNECTIONS = int(os.getenv("CONNSCAN_ORACLE_MAX_CONNECTIONS", "1000"))
MC_SAMPLES = int(os.getenv("CONNSCAN_MC_SAMPLES", "100000"))
PARTITION_IMBALANCE = float(os.getenv("CONNSCAN_IMBALANCE", "0.2"))

CORS_ORIGINS = [o.strip() for o in os.getenv("CONNSCAN_CORS_ORIGINS", "*").split(",") if o.strip()]

_configured = False


def setup_logging(level: str = LOG_LEVEL) -> None:
    """Configura el logger raíz una sola vez"""
    global _configured
    if _configured:
        return
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    _configured = True
