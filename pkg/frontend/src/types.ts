/** Wire shapes served by the simulator's HTTP API. */

export type LatLng = [number, number];

export interface EventRecord {
  seq: number;
  sim_time: number;
  kind: string;
  actor: string;
  payload: Record<string, unknown>;
}

export interface RouteInfo {
  waypoints: LatLng[];
  speed_kmh: number;
}

export interface CatalogItem {
  product: string;
  unit_price: number;
  stock_kg: number;
}

export interface EntityInfo {
  id: string;
  role: string;
  name: string;
  location: LatLng;
  catalog?: CatalogItem[];
  units?: string[];
}

export interface SnapshotOrder {
  order_id: string;
  buyer: string;
  seller: string | null;
  lines_kg: Record<string, number>;
  status: string;
  created_at: number;
  process: string;
  trigger: string;
}

export interface SnapshotVehicle {
  shipment_id: string;
  order_id: string;
  tracking_number: string;
  carrier: string;
  logistics: string;
  seller: string;
  buyer: string;
  lines_kg: Record<string, number>;
  route: RouteInfo;
  quoted_eta_s: number;
  position: LatLng;
  progress: number;
  status: string;
  alerts: number;
}

export interface SnapshotAssessment {
  order_id: string;
  shipment_id: string;
  carrier: string;
  score: number;
  on_time: boolean;
  violation_fraction: number;
}

export interface Snapshot {
  sim_time: number;
  last_seq: number;
  ledgers: Record<string, Record<string, number>>;
  orders: Record<string, SnapshotOrder>;
  conversations: Record<string, unknown>;
  vehicles: Record<string, SnapshotVehicle>;
  sensors: Record<string, Record<string, { unit: string; value: number }>>;
  assessments: Record<string, SnapshotAssessment>;
}
