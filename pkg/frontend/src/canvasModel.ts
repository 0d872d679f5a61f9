/**
 * Drawing surface model. The brush draws a freehand outline; on release the
 * captured points become a vector polygon (what the server stores), so the
 * canvas and the backend agree on geometry exactly.
 */

export interface BrushEntry {
  concept: string;
  color: string; // css color for the local preview
}

export const DEFAULT_BRUSHES: BrushEntry[] = [
  { concept: "Human", color: "rgb(150,5,61)" },
  { concept: "Cloud", color: "rgb(230,230,230)" },
  { concept: "Ocean", color: "rgb(9,7,230)" },
  { concept: "Grass", color: "rgb(4,250,7)" },
  { concept: "Tree", color: "rgb(4,200,3)" },
  { concept: "Lake", color: "rgb(61,230,250)" },
  { concept: "Flower", color: "rgb(255,5,153)" },
  { concept: "Sky", color: "rgb(6,230,230)" },
  { concept: "Mountain", color: "rgb(143,255,140)" },
  { concept: "Soil", color: "rgb(120,120,70)" },
];

export class PolygonBrush {
  private points: [number, number][] = [];
  private drawing = false;

  constructor(
    public concept: string,
    private width: number,
    private height: number,
    private minPointDistance = 2,
  ) {}

  begin(x: number, y: number): void {
    this.drawing = true;
    this.points = [[this.clampX(x), this.clampY(y)]];
  }

  move(x: number, y: number): void {
    if (!this.drawing) return;
    const [lastX, lastY] = this.points[this.points.length - 1];
    const cx = this.clampX(x);
    const cy = this.clampY(y);
    if (Math.hypot(cx - lastX, cy - lastY) >= this.minPointDistance) {
      this.points.push([cx, cy]);
    }
  }

  /** Finish the stroke; returns the polygon or null when it is degenerate. */
  end(): [number, number][] | null {
    this.drawing = false;
    const polygon = this.points;
    this.points = [];
    return polygon.length >= 3 ? polygon : null;
  }

  private clampX(x: number): number {
    return Math.min(Math.max(x, 0), this.width);
  }

  private clampY(y: number): number {
    return Math.min(Math.max(y, 0), this.height);
  }
}

/** Local preview: paint the polygons into a 2D canvas in draw order. */
export function paintRegions(
  context: CanvasRenderingContext2D,
  regions: { polygon: number[][]; color: string }[],
  background = "#000",
): void {
  context.fillStyle = background;
  context.fillRect(0, 0, context.canvas.width, context.canvas.height);
  for (const region of regions) {
    const [first, ...rest] = region.polygon;
    if (!first) continue;
    context.beginPath();
    context.moveTo(first[0], first[1]);
    for (const [x, y] of rest) context.lineTo(x, y);
    context.closePath();
    context.fillStyle = region.color;
    context.fill();
  }
}
