import logging

from fastapi import Depends, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from sqlalchemy import text
from sqlalchemy.orm import Session

from app.config import CORS_ORIGINS, setup_logging
from app.database.database import Base, engine, get_db
from app.routers import bench, queries, timetables

setup_logging()
logger = logging.getLogger("connscan")

app = FastAPI(
    title="connscan",
    version="1.0.0",
    description="Rutas en horarios de transporte: llegada más temprana, perfiles, retrasos y overlay",
)

app.include_router(timetables.router)
app.include_router(queries.router)
app.include_router(bench.router)

app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/")
def read_root():
    return {"message": "connscan"}


@app.get("/health")
def health_check(db: Session = Depends(get_db)):
    try:
        db.execute(text("SELECT 1"))
        return {"status": "ok", "database": "connected"}
    except Exception as e:
        return {"status": "error", "database": "disconnected", "detail": str(e)}


@app.on_event("startup")
async def startup_event():
    logger.info("🚀 Iniciando connscan...")
    try:
        from app.models import models  # noqa: F401  registra las tablas

        Base.metadata.create_all(bind=engine)
        logger.info("✅ Tablas verificadas/creadas")
    except Exception as e:
        logger.warning("⚠️ Error al crear tablas: %s", e)
    logger.info("✅ connscan iniciado correctamente")


@app.on_event("shutdown")
async def shutdown_event():
    logger.info("🛑 Deteniendo connscan...")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
