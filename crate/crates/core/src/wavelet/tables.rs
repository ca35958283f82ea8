//! Literal filter coefficients.
//!
//! Haar, Daubechies, Coiflet and biorthogonal values are the standard
//! published tables as distributed with PyWavelets 1.x (`rec_lo` / `dec_lo`),
//! printed in shortest round-trip decimal form. The published Symlet tables
//! carry only about twelve correct digits, which breaks orthonormality at the
//! 1e-12 level, so the Symlet entries were regenerated at 50-digit precision
//! by spectral factorization of the Daubechies polynomial, picking the root
//! selection that reproduces the published table (max deviation 4e-12), and
//! rounded to `f64`.
//!
//! Orthogonal families store only the scaling (reconstruction low-pass)
//! filter; the other three filters are derived by reversal and alternating
//! signs.
use std::f64::consts::FRAC_1_SQRT_2;

pub(super) const HAAR: [f64; 2] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];

pub(super) const DB2: [f64; 4] = [
    0.48296291314453416,
    0.8365163037378079,
    0.2241438680420134,
    -0.12940952255126037,
];

pub(super) const DB3: [f64; 6] = [
    0.33267055295008263,
    0.8068915093110925,
    0.45987750211849154,
    -0.13501102001025458,
    -0.08544127388202666,
    0.03522629188570953,
];

pub(super) const DB4: [f64; 8] = [
    0.2303778133088965,
    0.7148465705529157,
    0.6308807679298589,
    -0.027983769416859854,
    -0.18703481171909309,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];

pub(super) const DB5: [f64; 10] = [
    0.16010239797419293,
    0.6038292697971896,
    0.7243085284377729,
    0.13842814590132074,
    -0.24229488706638203,
    -0.032244869584638375,
    0.07757149384004572,
    -0.006241490212798274,
    -0.012580751999081999,
    0.0033357252854737712,
];

pub(super) const DB6: [f64; 12] = [
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
];

pub(super) const DB7: [f64; 14] = [
    0.07785205408500918,
    0.3965393194819173,
    0.7291320908462351,
    0.4697822874051931,
    -0.14390600392856498,
    -0.22403618499387498,
    0.07130921926683026,
    0.08061260915108308,
    -0.03802993693501441,
    -0.01657454163066688,
    0.01255099855609984,
    0.0004295779729213665,
    -0.0018016407040474908,
    0.00035371379997452024,
];

pub(super) const DB8: [f64; 16] = [
    0.05441584224310401,
    0.31287159091429995,
    0.6756307362972898,
    0.5853546836542067,
    -0.015829105256349306,
    -0.2840155429615469,
    0.0004724845739132828,
    0.12874742662047847,
    -0.017369301001807547,
    -0.044088253930794755,
    0.013981027917398282,
    0.008746094047405777,
    -0.004870352993451574,
    -0.00039174037337694705,
    0.0006754494064505693,
    -0.00011747678412476953,
];

pub(super) const SYM2: [f64; 4] = [
    0.48296291314453416,
    0.8365163037378079,
    0.2241438680420134,
    -0.12940952255126037,
];

pub(super) const SYM3: [f64; 6] = [
    0.33267055295008263,
    0.8068915093110925,
    0.45987750211849154,
    -0.13501102001025458,
    -0.08544127388202666,
    0.03522629188570953,
];

pub(super) const SYM4: [f64; 8] = [
    0.032223100604051466,
    -0.012603967262031304,
    -0.09921954357663353,
    0.29785779560530606,
    0.8037387518051321,
    0.497618667632775,
    -0.029635527646002493,
    -0.07576571478950221,
];

pub(super) const SYM5: [f64; 10] = [
    0.019538882735249827,
    -0.021101834024689042,
    -0.17532808990805623,
    0.01660210576451085,
    0.633978963456792,
    0.7234076904040407,
    0.19939753397685558,
    -0.039134249302313844,
    0.02951949092570626,
    0.027333068344998768,
];

pub(super) const SYM6: [f64; 12] = [
    -0.00780070832503238,
    0.0017677118642540077,
    0.04472490177078139,
    -0.02106029251237085,
    -0.07263752278637658,
    0.3379294217281658,
    0.787641141028651,
    0.49105594192797375,
    -0.04831174258569806,
    -0.11799011114852002,
    0.0034907120842221626,
    0.015404109327044824,
];

pub(super) const SYM7: [f64; 14] = [
    0.010268176708464817,
    0.0040102448715223955,
    -0.10780823770328972,
    -0.14004724044293365,
    0.2886296317506479,
    0.7677643170048829,
    0.5361019170905692,
    0.017441255086835708,
    -0.04955283493704283,
    0.06789269350122057,
    0.030515513165877885,
    -0.012636303403240567,
    -0.001047384888679738,
    0.002681814568260147,
];

pub(super) const SYM8: [f64; 16] = [
    0.001889950332767689,
    -0.0003029205147241331,
    -0.014952258337062199,
    0.0038087520138944896,
    0.04913717967373029,
    -0.027219029917103486,
    -0.0519458381078818,
    0.36444189483617895,
    0.777185751699628,
    0.4813596512590534,
    -0.061273359067811076,
    -0.14329423835127267,
    0.007607487324976609,
    0.03169508781152599,
    -0.0005421323318000107,
    -0.0033824159510050028,
];

pub(super) const COIF1: [f64; 6] = [
    -0.07273261951252645,
    0.3378976624574818,
    0.8525720202116004,
    0.3848648468648578,
    -0.07273261951252645,
    -0.015655728135791993,
];

pub(super) const COIF2: [f64; 12] = [
    0.01638733646320364,
    -0.04146493678687178,
    -0.0673725547237256,
    0.3861100668227629,
    0.8127236354494135,
    0.4170051844232391,
    -0.07648859907828076,
    -0.05943441864643109,
    0.02368017194684777,
    0.005611434819368834,
    -0.0018232088709110323,
    -0.000720549445520347,
];

pub(super) const COIF3: [f64; 18] = [
    -0.003793512864380802,
    0.007782596425672746,
    0.023452696142077168,
    -0.06577191128146936,
    -0.06112339000297255,
    0.40517690240911824,
    0.7937772226260872,
    0.42848347637737,
    -0.07179982161915484,
    -0.08230192710629983,
    0.03455502757329774,
    0.015880544863669452,
    -0.009007976136730624,
    -0.0025745176881367972,
    0.0011175187708306303,
    0.0004662169598204029,
    -7.0983302506379e-05,
    -3.459977319727278e-05,
];

pub(super) const BIOR1_3_DEC_LO: [f64; 6] = [
    -0.08838834764831845,
    0.08838834764831845,
    FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    0.08838834764831845,
    -0.08838834764831845,
];

pub(super) const BIOR1_3_REC_LO: [f64; 6] = [0.0, 0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0];

pub(super) const BIOR2_2_DEC_LO: [f64; 6] = [
    0.0,
    -0.1767766952966369,
    0.3535533905932738,
    1.0606601717798212,
    0.3535533905932738,
    -0.1767766952966369,
];

pub(super) const BIOR2_2_REC_LO: [f64; 6] = [
    0.0,
    0.3535533905932738,
    FRAC_1_SQRT_2,
    0.3535533905932738,
    0.0,
    0.0,
];

pub(super) const BIOR3_1_DEC_LO: [f64; 4] = [
    -0.3535533905932738,
    1.0606601717798212,
    1.0606601717798212,
    -0.3535533905932738,
];

pub(super) const BIOR3_1_REC_LO: [f64; 4] = [
    0.1767766952966369,
    0.5303300858899106,
    0.5303300858899106,
    0.1767766952966369,
];
